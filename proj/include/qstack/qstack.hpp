#pragma once

// Umbrella header.

#include "qstack/algorithms.hpp"
#include "qstack/bench.hpp"
#include "qstack/circuit.hpp"
#include "qstack/compiler.hpp"
#include "qstack/draw.hpp"
#include "qstack/error.hpp"
#include "qstack/frontend.hpp"
#include "qstack/gates.hpp"
#include "qstack/io.hpp"
#include "qstack/isa.hpp"
#include "qstack/matrix.hpp"
#include "qstack/simulator.hpp"
#include "qstack/statevector.hpp"
#include "qstack/unitary.hpp"
