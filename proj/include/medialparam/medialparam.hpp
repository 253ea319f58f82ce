#pragma once

#include "medialparam/curve.hpp"
#include "medialparam/delaunay.hpp"
#include "medialparam/dipole.hpp"
#include "medialparam/domain_io.hpp"
#include "medialparam/geom.hpp"
#include "medialparam/medial.hpp"
#include "medialparam/mesh_io.hpp"
#include "medialparam/param.hpp"
#include "medialparam/pipeline.hpp"
#include "medialparam/predicates.hpp"
#include "medialparam/remesh.hpp"
#include "medialparam/shapes.hpp"
#include "medialparam/svg.hpp"
#include "medialparam/voronoi.hpp"
