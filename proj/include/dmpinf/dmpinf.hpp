#pragma once

#include "dmpinf/graph.hpp"
#include "dmpinf/io.hpp"
#include "dmpinf/rng.hpp"
#include "dmpinf/parallel.hpp"
#include "dmpinf/ic_dmp.hpp"
#include "dmpinf/lt_dmp.hpp"
#include "dmpinf/mc_sim.hpp"
#include "dmpinf/exact_oracle.hpp"
#include "dmpinf/certificates.hpp"
#include "dmpinf/graph_gen.hpp"
#include "dmpinf/experiments.hpp"
