#pragma once

#include "cyclproj/convex_sets.hpp"
#include "cyclproj/cyclic_engine.hpp"
#include "cyclproj/errors.hpp"
#include "cyclproj/golden_section.hpp"
#include "cyclproj/metric.hpp"
#include "cyclproj/plane.hpp"
#include "cyclproj/product.hpp"
#include "cyclproj/scenarios.hpp"
#include "cyclproj/star_tree.hpp"
#include "cyclproj/twisted_chain.hpp"
