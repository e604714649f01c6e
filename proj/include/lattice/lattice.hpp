#pragma once

#include "lattice/error.hpp"
#include "lattice/network.hpp"
#include "lattice/unit_cell.hpp"
#include "lattice/patterns.hpp"
#include "lattice/printability.hpp"
#include "lattice/frame.hpp"
#include "lattice/sizing.hpp"
#include "lattice/io.hpp"
#include "lattice/config.hpp"
#include "lattice/workbench.hpp"
