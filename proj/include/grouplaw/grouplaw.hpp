#pragma once

// Umbrella header.

#include "grouplaw/bigint.hpp"
#include "grouplaw/descriptor_text.hpp"
#include "grouplaw/element.hpp"
#include "grouplaw/errors.hpp"
#include "grouplaw/estimate.hpp"
#include "grouplaw/finite.hpp"
#include "grouplaw/gens.hpp"
#include "grouplaw/geometry.hpp"
#include "grouplaw/group.hpp"
#include "grouplaw/harness.hpp"
#include "grouplaw/identity.hpp"
#include "grouplaw/law.hpp"
#include "grouplaw/matrix.hpp"
#include "grouplaw/parallel.hpp"
#include "grouplaw/random_gen.hpp"
#include "grouplaw/report.hpp"
#include "grouplaw/rng.hpp"
#include "grouplaw/serialize.hpp"
#include "grouplaw/walk.hpp"
