#pragma once

// Umbrella header.

#include "bphf/code_splitter.hpp"
#include "bphf/combinatorics.hpp"
#include "bphf/compose.hpp"
#include "bphf/counting.hpp"
#include "bphf/derand.hpp"
#include "bphf/eps_bias.hpp"
#include "bphf/errors.hpp"
#include "bphf/family.hpp"
#include "bphf/family_io.hpp"
#include "bphf/gf2.hpp"
#include "bphf/graph.hpp"
#include "bphf/numeric.hpp"
#include "bphf/parallel.hpp"
#include "bphf/params.hpp"
#include "bphf/pipeline.hpp"
#include "bphf/prng.hpp"
#include "bphf/random_build.hpp"
#include "bphf/rational.hpp"
