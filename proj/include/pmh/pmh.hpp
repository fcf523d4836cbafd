#pragma once

#include "pmh/beta_exact.hpp"
#include "pmh/dynamics.hpp"
#include "pmh/errors.hpp"
#include "pmh/experiments.hpp"
#include "pmh/figures.hpp"
#include "pmh/hierarchy.hpp"
#include "pmh/kl_geometry.hpp"
#include "pmh/measures.hpp"
#include "pmh/measures_io.hpp"
#include "pmh/parallel.hpp"
#include "pmh/predictive.hpp"
#include "pmh/properties.hpp"
#include "pmh/rational.hpp"
#include "pmh/rng.hpp"
#include "pmh/scoring.hpp"
#include "pmh/stopping.hpp"
#include "pmh/table.hpp"
