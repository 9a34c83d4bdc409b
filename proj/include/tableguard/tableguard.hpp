#pragma once

#include "tableguard/bench.hpp"
#include "tableguard/engine.hpp"
#include "tableguard/error.hpp"
#include "tableguard/gazetteer.hpp"
#include "tableguard/ledger.hpp"
#include "tableguard/metrics.hpp"
#include "tableguard/model.hpp"
#include "tableguard/random.hpp"
#include "tableguard/recognize.hpp"
#include "tableguard/serialize.hpp"
#include "tableguard/service.hpp"
#include "tableguard/strategies.hpp"
#include "tableguard/table.hpp"
#include "tableguard/text.hpp"
