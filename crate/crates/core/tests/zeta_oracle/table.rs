/// (sigma, t, re, im) — zeta(sigma + i t) from mpmath at 50 digits.
pub const ZETA_TABLE: [(f64, f64, f64, f64); 100] = [
    (0.55, 0.0, -1.678719552505874987463, 0.0),
    (0.55, 0.5, -0.4499006650763471072759, -1.066440408927610585875),
    (0.55, 1.0, 0.1736529661101393402207, -0.7541449324034889272807),
    (0.55, 3.14159, 0.5522130465536326154107, -0.05582411364826195213597),
    (0.55, 14.134, 0.03848906302847424677352, 0.005408249601902705074804),
    (0.55, 50.0, -0.004729884911037591274066, 0.3315011799613473897146),
    (0.55, 100.0, 2.517685405993909680254, -0.02942680894258450786097),
    (0.55, 1000.0, 0.5113796974303398956006, 0.7483348739188462113261),
    (0.55, 12345.6789, 0.7639870627325343607938, 0.154276481615085538299),
    (0.55, 99999.5, 1.518604942252536516789, 1.54970102836959555255),
    (0.6, 0.0, -1.952661448224000593345, 0.0),
    (0.6, 0.5, -0.4271800474012078921793, -1.181197914143456637278),
    (0.6, 1.0, 0.2069580069585121177936, -0.7850650883367108390712),
    (0.6, 3.14159, 0.561436729941492432929, -0.05922826557396261903141),
    (0.6, 14.134, 0.07540967163660699781452, 0.01084781787778177214775),
    (0.6, 50.0, 0.06515588830525992750372, 0.3303274136760803304022),
    (0.6, 100.0, 2.363697874792860303961, -0.0372219429354754914889),
    (0.6, 1000.0, 0.6288612811538081599449, 0.5984607865281873078026),
    (0.6, 12345.6789, 0.7212845989913114856554, 0.2838137167079504358491),
    (0.6, 99999.5, 1.174483361404788183355, 1.486044397331574216302),
    (0.75, 0.0, -3.441285386945222894395, 0.0),
    (0.75, 0.5, -0.2401410529536000482524, -1.562360750614463283396),
    (0.75, 1.0, 0.3280769073807452460118, -0.8655712804990721728632),
    (0.75, 3.14159, 0.5890876159186371225848, -0.06861294130746954504808),
    (0.75, 14.134, 0.1778517171628709495799, 0.02430126031247143010046),
    (0.75, 50.0, 0.2390352412598612931883, 0.3182488887062250164754),
    (0.75, 100.0, 2.002991995255395825136, -0.0543920711900925869232),
    (0.75, 1000.0, 0.8337131300031520265163, 0.2916234246335924879869),
    (0.75, 12345.6789, 0.7724025299893041959448, 0.4481047886046763466945),
    (0.75, 99999.5, 0.8152665546556284290988, 1.323815924880172789904),
    (0.8, 0.0, -4.437538415895551578779, 0.0),
    (0.8, 0.5, -0.1260331201451983232185, -1.686730478456999010419),
    (0.8, 1.0, 0.3748736673008762387365, -0.8864126093657670070466),
    (0.8, 3.14159, 0.59827618269791131753, -0.07145135984548861643264),
    (0.8, 14.134, 0.2093986703486855799021, 0.02793820502760318300264),
    (0.8, 50.0, 0.2869991602811024959476, 0.3121216841778623234677),
    (0.8, 100.0, 1.909837403757389362476, -0.05840138207723584683057),
    (0.8, 1000.0, 0.8704955318758032981758, 0.2227751420845909481848),
    (0.8, 12345.6789, 0.810615519674187345385, 0.4616108556628584012823),
    (0.8, 99999.5, 0.7964025930757591287459, 1.26723477404548891995),
    (0.9, 0.0, -9.430114019402254591107, 0.0),
    (0.9, 0.5, 0.1864610139313803812216, -1.886142298231233701472),
    (0.9, 1.0, 0.475713231390907999081, -0.9159495733024656314261),
    (0.9, 3.14159, 0.616569733134254815858, -0.07667339201245830332005),
    (0.9, 14.134, 0.2688839221966202847999, 0.03411409703828950503071),
    (0.9, 50.0, 0.370810624321148737479, 0.2977872366968045721566),
    (0.9, 100.0, 1.754636025884536879068, -0.06438371357600143547644),
    (0.9, 1000.0, 0.917086413843078960878, 0.118074652955338005481),
    (0.9, 12345.6789, 0.8881782278474211506903, 0.4599368861723686193114),
    (0.9, 99999.5, 0.8081955799228969050409, 1.150742088388883775065),
    (1.1, 0.0, 10.58444846495080095098, 0.0),
    (1.1, 0.5, 0.9703052313999779219366, -1.887120646748524881914),
    (1.1, 1.0, 0.6884942833328770261628, -0.9179647547729679604582),
    (1.1, 3.14159, 0.6526232407744580701632, -0.08523934174519655201895),
    (1.1, 14.134, 0.3746626140014995000806, 0.0427637230964520546017),
    (1.1, 50.0, 0.5002404794268526547249, 0.2643546090503305316032),
    (1.1, 100.0, 1.536734882267019945477, -0.07012346083682567907948),
    (1.1, 1000.0, 0.9521077516526445100418, -0.005825883396338919583245),
    (1.1, 12345.6789, 1.010688643464566007747, 0.4082714939305626822782),
    (1.1, 99999.5, 0.8790623241210058890183, 0.9280138461022124587366),
    (1.5, 0.0, 2.612375348685488343349, 0.0),
    (1.5, 0.5, 1.61368577384772348322, -0.9660993831927559825594),
    (1.5, 1.0, 1.017676719487493567477, -0.7320812572331683217448),
    (1.5, 3.14159, 0.7210173953549065963123, -0.09481766769667323289782),
    (1.5, 14.134, 0.5421178427490584652163, 0.04961527321831859195693),
    (1.5, 50.0, 0.6623749564022401169967, 0.1955111869607237107447),
    (1.5, 100.0, 1.310259881673752173008, -0.06726633522165320601425),
    (1.5, 1000.0, 0.9555445813034114897514, -0.09613241765159551067031),
    (1.5, 12345.6789, 1.121400984579181396641, 0.2866259830610644285398),
    (1.5, 99999.5, 0.9629813583755346298055, 0.5985036015756476753166),
    (2.0, 0.0, 1.644934066848226436472, 0.0),
    (2.0, 0.5, 1.446277905646579869358, -0.3687713046040467566251),
    (2.0, 1.0, 1.150355703254902671743, -0.4375308659196078811175),
    (2.0, 3.14159, 0.795640239354593614339, -0.09429481879286564399),
    (2.0, 14.134, 0.6891786855416555217747, 0.04735005310515658489294),
    (2.0, 50.0, 0.7739509331566907601823, 0.1259447158263341967157),
    (2.0, 100.0, 1.190780408775217015876, -0.05389095935426045832395),
    (2.0, 1000.0, 0.9532621843464251539192, -0.1107231074605998142921),
    (2.0, 12345.6789, 1.140979394068431636273, 0.1800076564025026456264),
    (2.0, 99999.5, 0.9889110285291160931974, 0.364718085148598210031),
    (2.5, 0.0, 1.341487257250917179757, 0.0),
    (2.5, 0.5, 1.276151392527780235923, -0.1714593093514596847727),
    (2.5, 1.0, 1.141716167822769315479, -0.2506789081539576366876),
    (2.5, 3.14159, 0.8551359610832760790148, -0.08433359146068708243805),
    (2.5, 14.134, 0.7883721888344986654756, 0.04027914815735366372459),
    (2.5, 50.0, 0.8408032499076017161904, 0.07861886319559578988236),
    (2.5, 100.0, 1.132214322583291801516, -0.03987661681000398515585),
    (2.5, 1000.0, 0.9584348070659966427618, -0.09698518393240988533014),
    (2.5, 12345.6789, 1.121334410320934254625, 0.1139442932946089852362),
    (2.5, 99999.5, 0.9935241414993895139838, 0.2339238569471189464295),
    (3.0, 0.0, 1.2020569031595942854, 0.0),
    (3.0, 0.5, 1.173928724638746767272, -0.09173026711347944580121),
    (3.0, 1.0, 1.107214408431409195625, -0.1482908671781753484908),
    (3.0, 3.14159, 0.8995578502428076944997, -0.07009444097590641911961),
    (3.0, 14.134, 0.8554254081567023007877, 0.03223570435540720512313),
    (3.0, 50.0, 0.8857531745717822944575, 0.04849147639256098559612),
    (3.0, 100.0, 1.095798573414997279759, -0.02846424977922695116103),
    (3.0, 1000.0, 0.9661647510345926192444, -0.07794906569526988626665),
    (3.0, 12345.6789, 1.094899325280349762827, 0.07286583295473813791447),
    (3.0, 99999.5, 0.994493040693836671374, 0.154740034699270849764),
];

pub const ZETA_TABLE_TALL: [(f64, f64, f64, f64); 4] = [
    (0.75, 1000000.0, 0.9535316058375145020352, 0.9525945894834273060176),
    (0.6, 5000000.0, 15.12547148980020112723, -0.3345056769727108096529),
    (0.9, 10000000.0, 3.387699615572664250393, 0.4591943717212092810326),
    (2.0, 10000000.0, 1.407406994435963466233, 0.1395826555343703318947),
];
