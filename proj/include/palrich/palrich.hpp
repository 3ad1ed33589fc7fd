#pragma once

// Umbrella header for the palindromic-richness toolkit.

#include "palrich/classify.hpp"
#include "palrich/core.hpp"
#include "palrich/language.hpp"
#include "palrich/morphism.hpp"
#include "palrich/palindromes.hpp"
#include "palrich/transfer.hpp"
