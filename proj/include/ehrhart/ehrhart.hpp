#pragma once

// Umbrella header.

#include "ehrhart/error.hpp"
#include "ehrhart/rational.hpp"
#include "ehrhart/linalg.hpp"
#include "ehrhart/series.hpp"
#include "ehrhart/cone.hpp"
#include "ehrhart/barvinok.hpp"
#include "ehrhart/mixed.hpp"
#include "ehrhart/engine.hpp"
#include "ehrhart/oracle.hpp"
#include "ehrhart/mu_dim2.hpp"
