#pragma once

#include "autocat/analytic.hpp"
#include "autocat/config.hpp"
#include "autocat/error.hpp"
#include "autocat/lattice.hpp"
#include "autocat/network.hpp"
#include "autocat/rng.hpp"
#include "autocat/scaling.hpp"
#include "autocat/simulate.hpp"
#include "autocat/special.hpp"
#include "autocat/verify.hpp"
