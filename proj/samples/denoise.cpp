#include <iostream>

#include "metaplectic/metaplectic.hpp"

int main(int argc, char** argv) {
    using namespace metaplectic;
    const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 1;
    const DenoiseScenario scenario = build_demo(seed);
    const DemoResult result = run_demo(scenario);
    std::cout << "SNR before filtering: " << result.snr_in_db << " dB\n"
              << "SNR after filtering:  " << result.snr_out_db << " dB\n";
}
