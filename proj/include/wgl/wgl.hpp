#pragma once

// Umbrella header: graph approximations of the Weierstrass curve, the cell
// measure, Dirichlet energies, graph Laplacians, normal derivatives and the
// spectral decimation machinery, plus serialization and the verification
// suite.

#include "wgl/bounds.hpp"
#include "wgl/energy.hpp"
#include "wgl/errors.hpp"
#include "wgl/export.hpp"
#include "wgl/graph.hpp"
#include "wgl/ifs.hpp"
#include "wgl/laplacian.hpp"
#include "wgl/measure.hpp"
#include "wgl/params.hpp"
#include "wgl/spectral.hpp"
#include "wgl/verify.hpp"
