#pragma once

// Umbrella header: exact recurrence solving, bounding, and verification.

#include "recsolve/approxbounds.hpp"
#include "recsolve/classify.hpp"
#include "recsolve/dcbounds.hpp"
#include "recsolve/error.hpp"
#include "recsolve/eval.hpp"
#include "recsolve/expoly.hpp"
#include "recsolve/expr.hpp"
#include "recsolve/linsolve.hpp"
#include "recsolve/normalize.hpp"
#include "recsolve/parser.hpp"
#include "recsolve/poly.hpp"
#include "recsolve/quad.hpp"
#include "recsolve/rat.hpp"
#include "recsolve/recurrence.hpp"
#include "recsolve/roots.hpp"
#include "recsolve/summation.hpp"
#include "recsolve/transforms.hpp"
#include "recsolve/varsolve.hpp"
#include "recsolve/verify.hpp"
