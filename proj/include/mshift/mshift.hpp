#pragma once

#include "mshift/classify.hpp"
#include "mshift/config.hpp"
#include "mshift/contraction.hpp"
#include "mshift/error.hpp"
#include "mshift/extension.hpp"
#include "mshift/graph.hpp"
#include "mshift/hom.hpp"
#include "mshift/permutation.hpp"
#include "mshift/rational.hpp"
#include "mshift/reduction.hpp"
#include "mshift/sgf.hpp"
#include "mshift/simulate.hpp"
