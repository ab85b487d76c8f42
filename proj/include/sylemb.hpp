// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sylemb/corpus/char_filter.hpp"
#include "sylemb/corpus/decomposition.hpp"
#include "sylemb/corpus/embedding_table.hpp"
#include "sylemb/corpus/oov.hpp"
#include "sylemb/corpus/ranking.hpp"
#include "sylemb/corpus/resolution.hpp"
#include "sylemb/corpus/statistics.hpp"
#include "sylemb/corpus/training_set.hpp"
#include "sylemb/embedder/embed.hpp"
#include "sylemb/embedder/gradients.hpp"
#include "sylemb/embedder/model.hpp"
#include "sylemb/embedder/serialize.hpp"
#include "sylemb/embedder/train.hpp"
#include "sylemb/errors.hpp"
#include "sylemb/evaluation/annotation.hpp"
#include "sylemb/evaluation/correlation.hpp"
#include "sylemb/evaluation/pairs.hpp"
#include "sylemb/io/container.hpp"
#include "sylemb/io/training_set.hpp"
#include "sylemb/nn/adam.hpp"
#include "sylemb/nn/gradcheck.hpp"
#include "sylemb/nn/ops.hpp"
#include "sylemb/nn/parameter.hpp"
#include "sylemb/nn/schedule.hpp"
#include "sylemb/nn/tape.hpp"
#include "sylemb/nn/tensor.hpp"
#include "sylemb/random.hpp"
#include "sylemb/splitter/char_vocab.hpp"
#include "sylemb/splitter/config.hpp"
#include "sylemb/splitter/decode.hpp"
#include "sylemb/splitter/grid.hpp"
#include "sylemb/splitter/model.hpp"
#include "sylemb/splitter/resolve.hpp"
#include "sylemb/splitter/serialize.hpp"
#include "sylemb/splitter/train.hpp"
#include "sylemb/utf8.hpp"
