#pragma once

// Umbrella header.

#include "motionblur/basis_frame.hpp"
#include "motionblur/bessel.hpp"
#include "motionblur/blur.hpp"
#include "motionblur/error.hpp"
#include "motionblur/expansion_io.hpp"
#include "motionblur/fourier_deconv.hpp"
#include "motionblur/hermite.hpp"
#include "motionblur/image.hpp"
#include "motionblur/image_io.hpp"
#include "motionblur/kernels.hpp"
#include "motionblur/laguerre.hpp"
#include "motionblur/phantom.hpp"
#include "motionblur/pipeline.hpp"
#include "motionblur/se2.hpp"
#include "motionblur/selftest.hpp"
#include "motionblur/spectral.hpp"
