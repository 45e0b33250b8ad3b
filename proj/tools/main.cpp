#include "torusfit/cli.hpp"

int main(int argc, char** argv) { return torusfit::dispatch(argc, argv); }
