#include "cli.hpp"

int main(int argc, char** argv) { return pairprod::cli::run(argc, argv); }
