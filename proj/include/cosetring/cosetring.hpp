#pragma once

#include "cosetring/error.hpp"
#include "cosetring/group.hpp"
#include "cosetring/fft.hpp"
#include "cosetring/function.hpp"
#include "cosetring/subgroup.hpp"
#include "cosetring/spectral.hpp"
#include "cosetring/bourgain.hpp"
#include "cosetring/refine.hpp"
#include "cosetring/freiman.hpp"
#include "cosetring/decompose.hpp"
#include "cosetring/lattice.hpp"
#include "cosetring/lca_model.hpp"
