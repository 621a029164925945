#pragma once
// Umbrella header: the whole library in one include.

#include "countra/machine.hpp"
#include "countra/tokenize.hpp"
#include "countra/serialize.hpp"
#include "countra/enumerate.hpp"
#include "countra/generate.hpp"
#include "countra/corpus.hpp"
#include "countra/transforms.hpp"
#include "countra/languages.hpp"
#include "countra/semilinear.hpp"
#include "countra/slstm.hpp"
