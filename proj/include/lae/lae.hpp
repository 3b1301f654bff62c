#pragma once

#include "lae/canonical.hpp"
#include "lae/decision.hpp"
#include "lae/document.hpp"
#include "lae/errors.hpp"
#include "lae/fuzz.hpp"
#include "lae/generators.hpp"
#include "lae/grades.hpp"
#include "lae/parser.hpp"
#include "lae/proofs.hpp"
#include "lae/propositional.hpp"
#include "lae/semantics.hpp"
#include "lae/spaces.hpp"
#include "lae/syntax.hpp"
#include "lae/world_set.hpp"
