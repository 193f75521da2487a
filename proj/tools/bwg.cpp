#include "bwg/cli.hpp"

int main(int argc, char** argv) { return bwg::cli::run_cli(argc, argv, std::cout, std::cerr); }
