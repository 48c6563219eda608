#include "fmt_cli.hpp"

int main(int argc, char** argv) { return fmt_cli::run(argc, argv); }
