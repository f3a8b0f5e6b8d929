#ifndef ERGOLAB_ERGOLAB_HPP
#define ERGOLAB_ERGOLAB_HPP

// Umbrella header: the whole laboratory.

#include "ergolab/bounds.hpp"
#include "ergolab/common.hpp"
#include "ergolab/config.hpp"
#include "ergolab/correlation.hpp"
#include "ergolab/ensemble.hpp"
#include "ergolab/fit.hpp"
#include "ergolab/grid.hpp"
#include "ergolab/inducing.hpp"
#include "ergolab/io.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/martingale.hpp"
#include "ergolab/observable.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/runner.hpp"
#include "ergolab/transfer.hpp"

#endif
