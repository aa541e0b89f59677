#include "brayiso/cli.hpp"

int main(int argc, char** argv) { return brayiso::run(argc, argv); }
