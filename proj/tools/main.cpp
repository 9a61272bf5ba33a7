#include "symstable/cli.hpp"

int main(int argc, char** argv) { return symstable::cli::run(argc, argv); }
