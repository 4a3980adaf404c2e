#ifndef BTRATE_BTRATE_HPP_
#define BTRATE_BTRATE_HPP_

#include "btrate/bradley_terry.hpp"
#include "btrate/compare.hpp"
#include "btrate/comparison_matrix.hpp"
#include "btrate/error.hpp"
#include "btrate/geometric.hpp"
#include "btrate/io.hpp"
#include "btrate/quasi_symmetry.hpp"
#include "btrate/random.hpp"
#include "btrate/rating.hpp"
#include "btrate/simulators.hpp"
#include "btrate/spectral.hpp"

#endif  // BTRATE_BTRATE_HPP_
