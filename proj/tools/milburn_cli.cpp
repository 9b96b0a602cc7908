#include "milburn/cli.hpp"

int main(int argc, char** argv) { return milburn::cli::run(argc, argv); }
