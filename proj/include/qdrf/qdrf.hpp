// qdrf.hpp — convenience header pulling in the whole library
#pragma once

#include "qdrf/units.hpp"
#include "qdrf/errors.hpp"
#include "qdrf/system.hpp"
#include "qdrf/quadrature.hpp"
#include "qdrf/fourier.hpp"
#include "qdrf/phonon.hpp"
#include "qdrf/photon.hpp"
#include "qdrf/liouvillian.hpp"
#include "qdrf/spectra.hpp"
#include "qdrf/engine.hpp"
#include "qdrf/ldos_io.hpp"
#include "qdrf/config.hpp"
#include "qdrf/sweep.hpp"
