#include "cli.hpp"

int main(int argc, char** argv) { return uboco::cli::run(argc, argv); }
