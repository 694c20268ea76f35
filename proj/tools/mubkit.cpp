#include "mubkit/cli.hpp"

int main(int argc, char** argv) { return mubkit::cli::main(argc, argv); }
