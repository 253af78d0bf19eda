#include "densepack/cli.hpp"

int main(int argc, char** argv) { return densepack::dispatch(argc, argv); }
