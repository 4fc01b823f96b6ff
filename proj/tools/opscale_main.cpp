#include <cstdio>

#include "opscale/opscale.hpp"

int main() {
    std::puts("opscale cli placeholder");
    return 0;
}
