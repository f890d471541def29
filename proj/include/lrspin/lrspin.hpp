#pragma once

#include "lrspin/drive_protocols.hpp"
#include "lrspin/errors.hpp"
#include "lrspin/lr_dynamics.hpp"
#include "lrspin/quadrature.hpp"
#include "lrspin/spectra.hpp"
#include "lrspin/spin_algebra.hpp"
#include "lrspin/spline.hpp"
