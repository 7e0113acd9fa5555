#include "cli.hpp"

int main(int argc, char** argv) { return cuspforge::cli::run_cli(argc, argv); }
