#pragma once

#include "ghostfringe/error.hpp"
#include "ghostfringe/fringe.hpp"
#include "ghostfringe/kernel.hpp"
#include "ghostfringe/optics.hpp"
#include "ghostfringe/parallel.hpp"
#include "ghostfringe/qgrid.hpp"
#include "ghostfringe/quadrature.hpp"
#include "ghostfringe/spectrum.hpp"
#include "ghostfringe/stochastic.hpp"
#include "ghostfringe/two_photon.hpp"
#include "ghostfringe/visibility.hpp"
