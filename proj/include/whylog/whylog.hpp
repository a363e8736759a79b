#pragma once

#include "whylog/coverage.hpp"
#include "whylog/error.hpp"
#include "whylog/model.hpp"
#include "whylog/proofs.hpp"
#include "whylog/semantics.hpp"
#include "whylog/syntax.hpp"
#include "whylog/term.hpp"
#include "whylog/transforms.hpp"
#include "whylog/worldset.hpp"
