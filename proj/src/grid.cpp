#include "wspline/grid.hpp"
