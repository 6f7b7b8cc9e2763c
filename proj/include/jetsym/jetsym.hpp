#pragma once

#include "jetsym/error.hpp"
#include "jetsym/scalar.hpp"
#include "jetsym/var_table.hpp"
#include "jetsym/poly.hpp"
#include "jetsym/linear.hpp"
#include "jetsym/series.hpp"
#include "jetsym/jet_space.hpp"
#include "jetsym/prolongation.hpp"
#include "jetsym/determining.hpp"
#include "jetsym/lie_algebra.hpp"
#include "jetsym/segre.hpp"
#include "jetsym/parser.hpp"
