#pragma once

// Umbrella header for the retrieval-augmented spelling-check toolkit.

#include "rspell/confusion_set.hpp"
#include "rspell/error.hpp"
#include "rspell/evaluation.hpp"
#include "rspell/lexicon_index.hpp"
#include "rspell/ngram_model.hpp"
#include "rspell/pinyin.hpp"
#include "rspell/pipeline.hpp"
#include "rspell/retriever.hpp"
#include "rspell/segmenter.hpp"
#include "rspell/sentence.hpp"
#include "rspell/speller.hpp"
#include "rspell/tool_config.hpp"
#include "rspell/training_control.hpp"
#include "rspell/utf8.hpp"

namespace rspell {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rspell
