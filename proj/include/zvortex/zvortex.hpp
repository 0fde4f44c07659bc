#pragma once

#include "energy.hpp"
#include "ensemble.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "io.hpp"
#include "ladder.hpp"
#include "vortex.hpp"
#include "wavecore.hpp"
