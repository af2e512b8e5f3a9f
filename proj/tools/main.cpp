#include "cli.hpp"

int main(int argc, char** argv) { return numsys::cli::run(argc, argv); }
