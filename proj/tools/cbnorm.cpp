#include "cbnorm/cli.hpp"

int main(int argc, char** argv) { return cbnorm::cli::main(argc, argv); }
