#pragma once

#include "behametric/errors.hpp"
#include "behametric/rational.hpp"
#include "behametric/numerics.hpp"
#include "behametric/lp.hpp"
#include "behametric/pseudometric.hpp"
#include "behametric/functor.hpp"
#include "behametric/lifting.hpp"
#include "behametric/oracle.hpp"
#include "behametric/coalgebra.hpp"
#include "behametric/fixpoint.hpp"
#include "behametric/well_behaved.hpp"
#include "behametric/json_io.hpp"
#include "behametric/sampling.hpp"
#include "behametric/checks.hpp"
