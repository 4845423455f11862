#ifndef BELLKIT_BELLKIT_HPP
#define BELLKIT_BELLKIT_HPP

#include "datasets.hpp"
#include "entanglement.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "models.hpp"
#include "prng.hpp"
#include "simulators.hpp"
#include "statistics.hpp"

#endif // BELLKIT_BELLKIT_HPP
