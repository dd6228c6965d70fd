#pragma once

// Umbrella header.

#include "lorentz/core.hpp"
#include "lorentz/model_spaces.hpp"
#include "lorentz/chains.hpp"
#include "lorentz/comparison.hpp"
#include "lorentz/asymptotics.hpp"
#include "lorentz/parallel.hpp"
#include "lorentz/splitting.hpp"
#include "lorentz/threads.hpp"
