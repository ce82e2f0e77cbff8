#pragma once

#include "sscov/applications.hpp"
#include "sscov/estimators.hpp"
#include "sscov/linalg.hpp"
#include "sscov/parallel.hpp"
#include "sscov/random.hpp"
#include "sscov/samplers.hpp"
#include "sscov/selection.hpp"
#include "sscov/spatial.hpp"
