// Transforms a Gaussian with a random 2-D free symplectic matrix, checks the
// fast path against direct quadrature, and inverts.
#include <iostream>

#include "metaplectic/metaplectic.hpp"

int main() {
    using namespace metaplectic;
    const Grid grid = Grid::centered(2, 64, 0.125);
    const Signal f = make_gaussian(grid);
    const SymplecticMatrix m = random_conditioned_symplectic(2, 42);

    const Signal fast = fmt_fast(f, m);
    const Signal direct = fmt_direct(f, m);
    const Signal back = ifmt(fast, m);

    std::cout << "fast vs direct, relative L2: " << relative_l2(fast, direct) << '\n'
              << "round trip, relative L2:     " << relative_l2(back, f) << '\n'
              << "norm before / after:         " << l2_norm(f) << " / " << l2_norm(fast) << '\n';
}
