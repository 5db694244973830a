#pragma once

#include "symrad/errors.hpp"
#include "symrad/fft.hpp"
#include "symrad/gaussian_radon.hpp"
#include "symrad/grid.hpp"
#include "symrad/interp.hpp"
#include "symrad/io.hpp"
#include "symrad/matrix.hpp"
#include "symrad/metaplectic.hpp"
#include "symrad/radon.hpp"
#include "symrad/states.hpp"
#include "symrad/symplectic.hpp"
#include "symrad/threading.hpp"
#include "symrad/wigner.hpp"
