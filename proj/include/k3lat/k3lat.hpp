#pragma once

// Umbrella header.

#include "k3lat/rational.hpp"
#include "k3lat/reconstruct.hpp"
#include "k3lat/gram_lattice.hpp"
#include "k3lat/kodaira.hpp"
#include "k3lat/mordell_weil.hpp"
#include "k3lat/fibration.hpp"
#include "k3lat/correspondence.hpp"
#include "k3lat/oldforms.hpp"
#include "k3lat/isogeny_graph.hpp"
#include "k3lat/pointhunt.hpp"
#include "k3lat/parallel.hpp"
