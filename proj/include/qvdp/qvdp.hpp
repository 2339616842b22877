#pragma once

#include "qvdp/analytic_oracles.hpp"
#include "qvdp/classical.hpp"
#include "qvdp/config.hpp"
#include "qvdp/density_matrix.hpp"
#include "qvdp/errors.hpp"
#include "qvdp/fock_algebra.hpp"
#include "qvdp/langevin.hpp"
#include "qvdp/liouvillian.hpp"
#include "qvdp/phase_space.hpp"
#include "qvdp/philox.hpp"
#include "qvdp/sweep.hpp"
#include "qvdp/analysis.hpp"
#include "qvdp/figures.hpp"
#include "qvdp/verify.hpp"
