#pragma once

#include "tpaflip/analytic.hpp"
#include "tpaflip/errors.hpp"
#include "tpaflip/oracle.hpp"
#include "tpaflip/quadrature.hpp"
#include "tpaflip/scan.hpp"
#include "tpaflip/spectral_model.hpp"
#include "tpaflip/verification.hpp"
