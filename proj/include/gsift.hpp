#pragma once

// Graph iterative-filtering toolkit: umbrella header.

#include "gsift/common.hpp"
#include "gsift/graph.hpp"
#include "gsift/delaunay.hpp"
#include "gsift/spectral.hpp"
#include "gsift/distance.hpp"
#include "gsift/sifting.hpp"
#include "gsift/window.hpp"
#include "gsift/decomposers.hpp"
#include "gsift/fif.hpp"
#include "gsift/signals.hpp"
#include "gsift/harness.hpp"
#include "gsift/io.hpp"
