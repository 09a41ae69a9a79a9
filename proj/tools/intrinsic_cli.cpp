#include "intrinsic/cli.hpp"

int main(int argc, char** argv) { return intrinsic::run(argc, argv); }
