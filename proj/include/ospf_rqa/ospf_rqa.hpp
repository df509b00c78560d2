#pragma once

#include "ospf_rqa/config.hpp"
#include "ospf_rqa/detector.hpp"
#include "ospf_rqa/errors.hpp"
#include "ospf_rqa/estimation.hpp"
#include "ospf_rqa/lsa.hpp"
#include "ospf_rqa/pcap.hpp"
#include "ospf_rqa/rqa.hpp"
#include "ospf_rqa/scenario.hpp"
#include "ospf_rqa/simulator.hpp"
#include "ospf_rqa/topology.hpp"
