#include <catch2/catch_amalgamated.hpp>
#include "splitvi/splitvi.hpp"
