#include <catch2/catch_amalgamated.hpp>
#include "gzk/gzk.hpp"
TEST_CASE("placeholder"){CHECK(1==1);}
