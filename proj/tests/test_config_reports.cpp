#include <catch2/catch_amalgamated.hpp>

#include "opscale/opscale.hpp"
