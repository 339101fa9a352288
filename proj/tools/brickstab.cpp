#include "brickstab/cli.hpp"

int main(int argc, char** argv) { return brickstab::cli::run(argc, argv); }
