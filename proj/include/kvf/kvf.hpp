#pragma once

#include "kvf/errors.hpp"
#include "kvf/field_spec.hpp"
#include "kvf/geometry.hpp"
#include "kvf/killing.hpp"
#include "kvf/linalg.hpp"
#include "kvf/locus.hpp"
#include "kvf/random.hpp"
#include "kvf/report.hpp"
#include "kvf/rigidity.hpp"
#include "kvf/tolerances.hpp"
#include "kvf/verify.hpp"
