#include "geoscene/cli.hpp"

int main(int argc, char** argv) {
    return geoscene::run_cli(argc, argv);
}
