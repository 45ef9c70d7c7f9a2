#pragma once

#include "octrack/errors.hpp"
#include "octrack/evaluation.hpp"
#include "octrack/linalg.hpp"
#include "octrack/lti.hpp"
#include "octrack/parallel.hpp"
#include "octrack/polynomial.hpp"
#include "octrack/rng.hpp"
#include "octrack/scenario.hpp"
#include "octrack/serialization.hpp"
#include "octrack/synthesis.hpp"
#include "octrack/trackers.hpp"
#include "octrack/version.hpp"
