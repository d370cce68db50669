#pragma once

#include "nmr/error.hpp"
#include "nmr/limits.hpp"
#include "nmr/boolean_function.hpp"
#include "nmr/formula.hpp"
#include "nmr/parser.hpp"
#include "nmr/model_set.hpp"
#include "nmr/theory.hpp"
#include "nmr/cnf.hpp"
#include "nmr/post_lattice.hpp"
#include "nmr/schaefer.hpp"
#include "nmr/default_logic.hpp"
#include "nmr/autoepistemic.hpp"
#include "nmr/circumscription.hpp"
#include "nmr/abduction.hpp"
#include "nmr/dispatcher.hpp"
#include "nmr/io.hpp"
