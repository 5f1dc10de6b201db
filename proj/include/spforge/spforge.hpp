// Umbrella header.
#pragma once

#include "spforge/dreps.hpp"
#include "spforge/errors.hpp"
#include "spforge/fields.hpp"
#include "spforge/io.hpp"
#include "spforge/linalg.hpp"
#include "spforge/nondeg.hpp"
#include "spforge/pathalg.hpp"
#include "spforge/potentials.hpp"
#include "spforge/quivers.hpp"
#include "spforge/spmut.hpp"
#include "spforge/unfold.hpp"
