#pragma once

#include "ryssub/scalar.hpp"
#include "ryssub/matrix.hpp"
#include "ryssub/tensor.hpp"
#include "ryssub/frame.hpp"
#include "ryssub/submersion.hpp"
#include "ryssub/soliton.hpp"
#include "ryssub/harmonic.hpp"
#include "ryssub/manifest.hpp"
#include "ryssub/report.hpp"
#include "ryssub/ledger.hpp"
