#pragma once

#include "tlfft/core.hpp"
#include "tlfft/experiment.hpp"
#include "tlfft/fft.hpp"
#include "tlfft/freqsets.hpp"
#include "tlfft/io.hpp"
#include "tlfft/lattice.hpp"
#include "tlfft/oracle.hpp"
#include "tlfft/sparse.hpp"
#include "tlfft/tfft.hpp"
#include "tlfft/transforms.hpp"
