#ifndef CHAOTIC_EXTREMES_CHAOTIC_EXTREMES_HPP
#define CHAOTIC_EXTREMES_CHAOTIC_EXTREMES_HPP

#include "errors.hpp"
#include "evt.hpp"
#include "format.hpp"
#include "invariant_measure.hpp"
#include "map_parameter.hpp"
#include "model_io.hpp"
#include "parallel.hpp"
#include "quadratic_core.hpp"
#include "random.hpp"

#endif  // CHAOTIC_EXTREMES_CHAOTIC_EXTREMES_HPP
