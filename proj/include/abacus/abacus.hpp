#pragma once

#include "abacus/community.hpp"
#include "abacus/errors.hpp"
#include "abacus/fcim.hpp"
#include "abacus/graph.hpp"
#include "abacus/io.hpp"
#include "abacus/membership.hpp"
#include "abacus/pipeline.hpp"
#include "abacus/synth.hpp"
