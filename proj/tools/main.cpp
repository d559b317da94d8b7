#include "g2kit/cli.hpp"

int main(int argc, char** argv) { return g2kit::cli::run(argc, argv); }
