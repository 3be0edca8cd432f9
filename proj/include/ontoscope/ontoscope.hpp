#pragma once

// Umbrella header for the whole toolkit.

#include "ontoscope/classify.hpp"
#include "ontoscope/io.hpp"
#include "ontoscope/ontic.hpp"
#include "ontoscope/overlap.hpp"
#include "ontoscope/quantum.hpp"
#include "ontoscope/random.hpp"
#include "ontoscope/simplex.hpp"
#include "ontoscope/theorems.hpp"
#include "ontoscope/zoo.hpp"
