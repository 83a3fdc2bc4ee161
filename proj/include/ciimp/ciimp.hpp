#pragma once

// Umbrella header: the full conditional-independence implication toolkit.

#include "ciimp/bench.hpp"
#include "ciimp/closure.hpp"
#include "ciimp/engine.hpp"
#include "ciimp/falsifier.hpp"
#include "ciimp/generator.hpp"
#include "ciimp/instance_file.hpp"
#include "ciimp/integer_feasibility.hpp"
#include "ciimp/joint_table.hpp"
#include "ciimp/parallel.hpp"
#include "ciimp/rational.hpp"
#include "ciimp/rng.hpp"
#include "ciimp/semilattice.hpp"
#include "ciimp/set_function.hpp"
#include "ciimp/simplex.hpp"
#include "ciimp/sparse_matrix.hpp"
#include "ciimp/statement.hpp"
#include "ciimp/universe.hpp"
#include "ciimp/validator.hpp"
