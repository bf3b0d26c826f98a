#pragma once

#include "cep/ordinal.hpp"
#include "cep/proof_graph.hpp"
#include "cep/proof_io.hpp"
#include "cep/traces.hpp"
#include "cep/soundness.hpp"
#include "cep/automata.hpp"
#include "cep/automaton_io.hpp"
#include "cep/restrictions.hpp"
#include "cep/containment.hpp"
#include "cep/decision.hpp"
#include "cep/report.hpp"
