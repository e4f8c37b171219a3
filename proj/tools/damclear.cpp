#include "dam/cli.hpp"

int main(int argc, char** argv) { return dam::cli::run(argc, argv); }
