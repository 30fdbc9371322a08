#pragma once

// Umbrella header: the whole library in dependency order.

#include "defs.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "parallel.hpp"
#include "complex.hpp"
#include "group.hpp"
#include "space.hpp"
#include "gauge.hpp"
#include "equivariant.hpp"
#include "energy.hpp"
#include "jacobi.hpp"
#include "gap.hpp"
#include "fixedpoint.hpp"
#include "axioms.hpp"
#include "io.hpp"
