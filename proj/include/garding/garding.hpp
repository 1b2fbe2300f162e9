#pragma once

#include "garding/concavity.hpp"
#include "garding/conformal.hpp"
#include "garding/curvature.hpp"
#include "garding/errors.hpp"
#include "garding/polynomial.hpp"
#include "garding/rootedness.hpp"
#include "garding/symmpoly.hpp"
