#pragma once

#include "roadsect/error.hpp"
#include "roadsect/geom.hpp"
#include "roadsect/roadgraph.hpp"
#include "roadsect/seeding.hpp"
#include "roadsect/tessellate.hpp"
#include "roadsect/partition.hpp"
#include "roadsect/evaluate.hpp"
#include "roadsect/synthetic.hpp"
#include "roadsect/geojson.hpp"
#include "roadsect/diagnostics.hpp"
#include "roadsect/pipeline.hpp"
#include "roadsect/svg.hpp"
