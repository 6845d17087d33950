#include "fcrec/cli.hpp"

int main(int argc, char** argv) {
    return fcrec::runMain(argc, argv);
}
