#pragma once

// Umbrella header.

#include "mivote/domain.hpp"
#include "mivote/dominance.hpp"
#include "mivote/dynamics.hpp"
#include "mivote/error.hpp"
#include "mivote/experiments.hpp"
#include "mivote/fixtures.hpp"
#include "mivote/io.hpp"
#include "mivote/nonatomic.hpp"
#include "mivote/uncertainty.hpp"
