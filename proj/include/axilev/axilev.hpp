#pragma once
// Convenience umbrella: the whole pipeline in one include.

#include "axilev/units.hpp"
#include "axilev/quadrature.hpp"
#include "axilev/bessel.hpp"
#include "axilev/optomech.hpp"
#include "axilev/axion.hpp"
#include "axilev/metrology.hpp"
#include "axilev/constraint.hpp"
#include "axilev/config.hpp"
#include "axilev/io.hpp"
#include "axilev/verify.hpp"
