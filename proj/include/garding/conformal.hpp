#pragma once

#include "garding/conformal/field_io.hpp"
#include "garding/conformal/grid.hpp"
#include "garding/conformal/solver.hpp"
#include "garding/conformal/spectral.hpp"
