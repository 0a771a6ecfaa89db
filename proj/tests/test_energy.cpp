#include <doctest.h>
#include "mhdbl/mhdbl.hpp"
