#pragma once

#include "thinfem/covering.hpp"
#include "thinfem/error.hpp"
#include "thinfem/field.hpp"
#include "thinfem/geometry.hpp"
#include "thinfem/interp.hpp"
#include "thinfem/mesh.hpp"
#include "thinfem/mesh_io.hpp"
#include "thinfem/planar.hpp"
#include "thinfem/plan_io.hpp"
#include "thinfem/poisson.hpp"
#include "thinfem/quadrature.hpp"
#include "thinfem/quality.hpp"
#include "thinfem/reference.hpp"
#include "thinfem/sparse.hpp"
