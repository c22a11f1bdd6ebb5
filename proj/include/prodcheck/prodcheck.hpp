#pragma once

// Umbrella header: the whole checker in one include.

#include "prodcheck/cs_engine.hpp"
#include "prodcheck/csrs_export.hpp"
#include "prodcheck/enumerate.hpp"
#include "prodcheck/exhaustiveness.hpp"
#include "prodcheck/parser.hpp"
#include "prodcheck/prover.hpp"
#include "prodcheck/replacement_map.hpp"
#include "prodcheck/report.hpp"
#include "prodcheck/rewrite.hpp"
#include "prodcheck/simulate.hpp"
#include "prodcheck/spec_check.hpp"
#include "prodcheck/system.hpp"
#include "prodcheck/term.hpp"
