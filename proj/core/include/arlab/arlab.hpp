#pragma once

#include "arlab/bessel.hpp"
#include "arlab/circle_function.hpp"
#include "arlab/errors.hpp"
#include "arlab/fokker_planck.hpp"
#include "arlab/io.hpp"
#include "arlab/kernel.hpp"
#include "arlab/manifold.hpp"
#include "arlab/particle.hpp"
#include "arlab/potential.hpp"
#include "arlab/reduced_flow.hpp"
#include "arlab/scan.hpp"
#include "arlab/spectral_density.hpp"
#include "arlab/trig_polynomial.hpp"
