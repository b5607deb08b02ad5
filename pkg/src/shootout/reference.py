"""Published reference values checked by ``--check`` and the acceptance tests.

Figure-style series are ``(x, y)`` pairs as printed; Table 3 values are
rounded to three decimals.
"""

TABLE3 = {
    # rounds: (catchup, adj-catchup, abba)
    1: (0.526, 0.526, 0.526),
    2: (0.516, 0.495, 0.511),
    3: (0.518, 0.515, 0.519),
    4: (0.513, 0.501, 0.508),
    5: (0.514, 0.509, 0.515),
    6: (0.512, 0.504, 0.507),
    7: (0.512, 0.507, 0.513),
    8: (0.511, 0.504, 0.506),
}
TABLE3_TOLERANCE = 5e-4

# win probability of A over five rounds plus sudden death at the same (p, q),
# keyed by p then mechanism; points are (q, value)
SWEEP_CURVES = {
    "0.65": {
        "catchup": [
            (0.5, 0.525300273437499),
            (0.51, 0.523562559213668),
            (0.52, 0.521833617997753),
            (0.53, 0.520112973238883),
            (0.54, 0.51840018512185),
            (0.55, 0.516694853996055),
            (0.56, 0.514996623939367),
            (0.57, 0.51330518645503),
            (0.58, 0.511620284299782),
            (0.59, 0.509941715441386),
            (0.6, 0.50826933714379),
            (0.61, 0.506603070178177),
            (0.62, 0.504942903158171),
            (0.63, 0.503288896997526),
            (0.64, 0.5016411894886),
            (0.65, 0.499999999999999),
        ],
        "adj-catchup": [
            (0.5, 0.514751738281249),
            (0.51, 0.513696697826338),
            (0.52, 0.512658143775894),
            (0.53, 0.511634529931487),
            (0.54, 0.51062434710905),
            (0.55, 0.509626121726755),
            (0.56, 0.508638414399471),
            (0.57, 0.507659818539704),
            (0.58, 0.506688958964948),
            (0.59, 0.50572449051135),
            (0.6, 0.504765096653594),
            (0.61, 0.503809488130937),
            (0.62, 0.50285640157929),
            (0.63, 0.501904598169296),
            (0.64, 0.500952862250274),
            (0.65, 0.499999999999999),
        ],
        "abba": [
            (0.5, 0.5251110546875),
            (0.51, 0.52345432316409),
            (0.52, 0.521799153507241),
            (0.53, 0.520144615599161),
            (0.54, 0.51848978255417),
            (0.55, 0.516833728906147),
            (0.56, 0.51517552882792),
            (0.57, 0.513514254382137),
            (0.58, 0.511848973803196),
            (0.59, 0.510178749809797),
            (0.6, 0.508502637947711),
            (0.61, 0.506819684962334),
            (0.62, 0.505128927200628),
            (0.63, 0.503429389042058),
            (0.64, 0.501720081358108),
            (0.65, 0.499999999999999),
        ],
    },
    "0.7": {
        "catchup": [
            (0.5, 0.534426666666667),
            (0.51, 0.532639204800457),
            (0.52, 0.530861196930458),
            (0.53, 0.529092046249439),
            (0.54, 0.527331185282417),
            (0.55, 0.525578079517269),
            (0.56, 0.523832231256477),
            (0.57, 0.522093183685991),
            (0.58, 0.52036052515721),
            (0.59, 0.518633893678204),
            (0.6, 0.516912981610389),
            (0.61, 0.515197540566901),
            (0.62, 0.513487386509044),
            (0.63, 0.51178240503723),
            (0.64, 0.510082556872903),
            (0.65, 0.508387883528044),
            (0.66, 0.506698513158861),
            (0.67, 0.505014666600412),
            (0.68, 0.503336663578914),
            (0.69, 0.501664929098599),
            (0.7, 0.499999999999999),
        ],
        "adj-catchup": [
            (0.5, 0.520995416666667),
            (0.51, 0.519829491478846),
            (0.52, 0.518684131373713),
            (0.53, 0.517557837646061),
            (0.54, 0.516449142197786),
            (0.55, 0.515356605919407),
            (0.56, 0.514278817099576),
            (0.57, 0.513214389862091),
            (0.58, 0.512161962629887),
            (0.59, 0.511120196615517),
            (0.6, 0.510087774337661),
            (0.61, 0.509063398163157),
            (0.62, 0.508045788874117),
            (0.63, 0.507033684259678),
            (0.64, 0.506025837731918),
            (0.65, 0.505021016965544),
            (0.66, 0.504018002560878),
            (0.67, 0.503015586729771),
            (0.68, 0.502012572004001),
            (0.69, 0.501007769965789),
            (0.7, 0.499999999999999),
        ],
        "abba": [
            (0.5, 0.534019166666667),
            (0.51, 0.532348500064522),
            (0.52, 0.530680527432549),
            (0.53, 0.52901426747192),
            (0.54, 0.527348745478119),
            (0.55, 0.525682991185033),
            (0.56, 0.52401603667503),
            (0.57, 0.522346914353848),
            (0.58, 0.520674654989077),
            (0.59, 0.518998285811096),
            (0.6, 0.517316828675324),
            (0.61, 0.515629298284671),
            (0.62, 0.513934700471096),
            (0.63, 0.512232030535226),
            (0.64, 0.510520271642956),
            (0.65, 0.508798393278044),
            (0.66, 0.507065349749677),
            (0.67, 0.505320078754026),
            (0.68, 0.503561499988837),
            (0.69, 0.501788513820122),
            (0.7, 0.5),
        ],
    },
    "0.75": {
        "catchup": [
            (0.5, 0.5440673828125),
            (0.51, 0.542229106189265),
            (0.52, 0.540401111523179),
            (0.53, 0.538582659882039),
            (0.54, 0.536773033597861),
            (0.55, 0.534971539606812),
            (0.56, 0.533177513137254),
            (0.57, 0.531390321737962),
            (0.58, 0.529609369638798),
            (0.59, 0.527834102436286),
            (0.6, 0.526064012096773),
            (0.61, 0.524298642270021),
            (0.62, 0.52253759390625),
            (0.63, 0.520780531169877),
            (0.64, 0.519027187643311),
            (0.65, 0.517277372814359),
            (0.66, 0.51553097884098),
            (0.67, 0.513787987587242),
            (0.68, 0.512048477924528),
            (0.69, 0.510312633292147),
            (0.7, 0.508580749511717),
            (0.71, 0.506853242849736),
            (0.72, 0.50513065832298),
            (0.73, 0.503413678241461),
            (0.74, 0.501703130983796),
            (0.75, 0.5),
        ],
        "adj-catchup": [
            (0.5, 0.52850341796875),
            (0.51, 0.527203045850966),
            (0.52, 0.525926275986755),
            (0.53, 0.524671662000348),
            (0.54, 0.523437785310854),
            (0.55, 0.522223252993723),
            (0.56, 0.52102669572549),
            (0.57, 0.519846765809916),
            (0.58, 0.518682135283684),
            (0.59, 0.517531494099818),
            (0.6, 0.516393548387096),
            (0.61, 0.515267018783749),
            (0.62, 0.51415063884375),
            (0.63, 0.513043153514101),
            (0.64, 0.511943317681527),
            (0.65, 0.510849894787015),
            (0.66, 0.509761655506724),
            (0.67, 0.50867737649778),
            (0.68, 0.507595839207547),
            (0.69, 0.506515828744942),
            (0.7, 0.505436132812499),
            (0.71, 0.504355540697794),
            (0.72, 0.50327284232298),
            (0.73, 0.502186827351162),
            (0.74, 0.50109628434838),
            (0.75, 0.5),
        ],
        "abba": [
            (0.5, 0.543416341145833),
            (0.51, 0.5417262037701),
            (0.52, 0.540040225255628),
            (0.53, 0.538357348243028),
            (0.54, 0.536676526840624),
            (0.55, 0.534996723872949),
            (0.56, 0.533316908264052),
            (0.57, 0.531636052552565),
            (0.58, 0.529953130535551),
            (0.59, 0.528267115038188),
            (0.6, 0.526576975806451),
            (0.61, 0.524881677520056),
            (0.62, 0.523180177922916),
            (0.63, 0.521471426068529),
            (0.64, 0.519754360677706),
            (0.65, 0.51802790860615),
            (0.66, 0.516290983419461),
            (0.67, 0.514542484073185),
            (0.68, 0.512781293695597),
            (0.69, 0.511006278470963),
            (0.7, 0.509216286621093),
            (0.71, 0.507410147483021),
            (0.72, 0.505586670680744),
            (0.73, 0.503744645388969),
            (0.74, 0.501882839686883),
            (0.75, 0.5),
        ],
    },
    "0.8": {
        "catchup": [
            (0.5, 0.554339999999999),
            (0.51, 0.55245345119556),
            (0.52, 0.550578258939448),
            (0.53, 0.548713514201494),
            (0.54, 0.546858322367039),
            (0.55, 0.545011805490196),
            (0.56, 0.543173105082879),
            (0.57, 0.541341385425044),
            (0.58, 0.539515837381973),
            (0.59, 0.537695682714915),
            (0.6, 0.535880178871795),
            (0.61, 0.534068624245116),
            (0.62, 0.532260363884574),
            (0.63, 0.530454795652269),
            (0.64, 0.528651376808805),
            (0.65, 0.526849631018867),
            (0.66, 0.525049155765266),
            (0.67, 0.523249630160701),
            (0.68, 0.521450823146908),
            (0.69, 0.51965260207105),
            (0.7, 0.517854941629629),
            (0.71, 0.516057933170377),
            (0.72, 0.514261794342951),
            (0.73, 0.51246687908946),
            (0.74, 0.510673687966158),
            (0.75, 0.508882878787878),
            (0.76, 0.507095277586996),
            (0.77, 0.505311889879008),
            (0.78, 0.503533912226981),
            (0.79, 0.50176274409738),
            (0.8, 0.5),
        ],
        "adj-catchup": [
            (0.5, 0.537739999999999),
            (0.51, 0.536289210453938),
            (0.52, 0.534863879573048),
            (0.53, 0.533462588107087),
            (0.54, 0.532083946306869),
            (0.55, 0.530726590784314),
            (0.56, 0.529389181575679),
            (0.57, 0.528070399402457),
            (0.58, 0.526768943124559),
            (0.59, 0.525483527380601),
            (0.6, 0.524212880410256),
            (0.61, 0.522955742053779),
            (0.62, 0.521710861923976),
            (0.63, 0.52047699774603),
            (0.64, 0.519252913860732),
            (0.65, 0.518037379886791),
            (0.66, 0.516829169538066),
            (0.67, 0.515627059591605),
            (0.68, 0.514429829002621),
            (0.69, 0.513236258162518),
            (0.7, 0.512045128296295),
            (0.71, 0.510855220995723),
            (0.72, 0.509665317884786),
            (0.73, 0.508474200414014),
            (0.74, 0.507280649780395),
            (0.75, 0.506083446969696),
            (0.76, 0.504881372918057),
            (0.77, 0.503673208789864),
            (0.78, 0.502457736368978),
            (0.79, 0.501233738560451),
            (0.8, 0.5),
        ],
        "abba": [
            (0.5, 0.553459999999999),
            (0.51, 0.551743607981312),
            (0.52, 0.550033322536201),
            (0.53, 0.548327975973656),
            (0.54, 0.546626419247598),
            (0.55, 0.544927518169935),
            (0.56, 0.543230149890559),
            (0.57, 0.541533199637049),
            (0.58, 0.539835557706987),
            (0.59, 0.53813611670611),
            (0.6, 0.536433769025641),
            (0.61, 0.534727404552404),
            (0.62, 0.533015908605498),
            (0.63, 0.531298160093499),
            (0.64, 0.529573029886344),
            (0.65, 0.527839379396225),
            (0.66, 0.526096059361998),
            (0.67, 0.524341908831759),
            (0.68, 0.522575754338425),
            (0.69, 0.520796409263299),
            (0.7, 0.519002673382715),
            (0.71, 0.517193332593083),
            (0.72, 0.515367158809699),
            (0.73, 0.513522910034894),
            (0.74, 0.511659330591167),
            (0.75, 0.509775151515151),
            (0.76, 0.50786909110826),
            (0.77, 0.505939855640135),
            (0.78, 0.503986140200985),
            (0.79, 0.502006629699113),
            (0.8, 0.5),
        ],
    },
}
FIGURE_TOLERANCE = 1e-9

# empirical per-round rates, bars keyed by sudden-death (p, q) then mechanism
EMPIRICAL_BARS = {
    ("2/3", "3/5"): {"catchup": 0.52794530463813, "adj-catchup": 0.523678538465, "abba": 0.538255247188209},
    ("3/4", "2/3"): {"catchup": 0.527520306595316, "adj-catchup": 0.522355273859421, "abba": 0.536959358460168},
    ("3/4", "3/5"): {"catchup": 0.525470719259806, "adj-catchup": 0.515973723584129, "abba": 0.530709830562039},
}

# probability of reaching sudden death after five rounds; "empirical" is the
# per-round preset. Catch-Up and Adjusted Catch-Up share a bar.
TIE_BARS = {
    ("2/3", "3/5"): {"catchup": 0.264607078189, "abba": 0.256832263375},
    ("3/4", "2/3"): {"catchup": 0.283733603395, "abba": 0.274731545782},
    ("3/4", "3/5"): {"catchup": 0.2809675, "abba": 0.266798125},
    "empirical": {"catchup": 0.289133316319, "abba": 0.2831516870768},
}

ALPHA_THRESHOLDS = {"catchup": 0.6569, "abba": 0.6252}
ALPHA_TOLERANCE = 5e-4

# lower q boundary of the region where Adjusted Catch-Up is fairer, points (p, q_min)
REGION_CURVES = {
    "catchup": [
        (0.5, 0.0293548629655568),
        (0.51, 0.0422275082602959),
        (0.52, 0.0549405974588224),
        (0.53, 0.0674970788296377),
        (0.54, 0.079899828448649),
        (0.55, 0.0921516523953994),
        (0.56, 0.104255288869607),
        (0.57, 0.116213410231363),
        (0.58, 0.128028624968195),
        (0.59, 0.139703479592011),
        (0.6, 0.151240460468851),
        (0.61, 0.162641995584189),
        (0.62, 0.173910456246421),
        (0.63, 0.185048158731057),
        (0.64, 0.196057365868001),
        (0.65, 0.20694028857421),
        (0.66, 0.217699087333915),
        (0.67, 0.228335873628476),
        (0.68, 0.238852711317871),
        (0.69, 0.249251617975701),
        (0.7, 0.259534566179549),
        (0.71, 0.269703484758399),
        (0.72, 0.279760259998791),
        (0.73, 0.28970673681129),
        (0.74, 0.299544719858785),
        (0.75, 0.309275974648064),
        (0.76, 0.318902228586056),
        (0.77, 0.328425172002066),
        (0.78, 0.337846459137274),
        (0.79, 0.347167709102712),
        (0.8, 0.356390506806885),
        (0.81, 0.36551640385416),
        (0.82, 0.374546919414978),
        (0.83, 0.383483541068926),
        (0.84, 0.392327725621647),
        (0.85, 0.401080899896533),
        (0.86, 0.409744461502099),
        (0.87, 0.41831977957591),
        (0.88, 0.426808195505893),
        (0.89, 0.435211023629828),
        (0.9, 0.443529551913787),
        (0.91, 0.451765042610256),
        (0.92, 0.459918732896645),
        (0.93, 0.467991835494873),
        (0.94, 0.475985539272656),
        (0.95, 0.483901009827163),
        (0.96, 0.491739390051598),
        (0.97, 0.49950180068532),
        (0.98, 0.507189340848043),
        (0.99, 0.514803088558653),
        (1, 0.522344101239149),
    ],
    "abba": [
        (0.5, 0.124513935959349),
        (0.51, 0.136334619722923),
        (0.52, 0.148038116818235),
        (0.53, 0.159626161279491),
        (0.54, 0.171100453097021),
        (0.55, 0.182462659048665),
        (0.56, 0.193714413506922),
        (0.57, 0.204857319222661),
        (0.58, 0.215892948086207),
        (0.59, 0.226822841866549),
        (0.6, 0.237648512929396),
        (0.61, 0.248371444934794),
        (0.62, 0.258993093514977),
        (0.63, 0.269514886933094),
        (0.64, 0.279938226723453),
        (0.65, 0.290264488313864),
        (0.66, 0.300495021630689),
        (0.67, 0.310631151687129),
        (0.68, 0.320674179155308),
        (0.69, 0.330625380922667),
        (0.7, 0.340486010633156),
        (0.71, 0.350257299213724),
        (0.72, 0.359940455386561),
        (0.73, 0.369536666167542),
        (0.74, 0.379047097351301),
        (0.75, 0.388472893983359),
        (0.76, 0.397815180819703),
        (0.77, 0.407075062774199),
        (0.78, 0.416253625354224),
        (0.79, 0.425351935084866),
        (0.8, 0.434371039922049),
        (0.81, 0.443311969654913),
        (0.82, 0.452175736297776),
        (0.83, 0.460963334471996),
        (0.84, 0.469675741778023),
        (0.85, 0.478313919157945),
        (0.86, 0.486878811248813),
        (0.87, 0.495371346726998),
        (0.88, 0.503792438643868),
        (0.89, 0.512142984753026),
        (0.9, 0.520423867829358),
        (0.91, 0.528635955980125),
        (0.92, 0.536780102948342),
        (0.93, 0.544857148408652),
        (0.94, 0.552867918255918),
        (0.95, 0.560813224886743),
        (0.96, 0.56869386747411),
        (0.97, 0.576510632235352),
        (0.98, 0.584264292693622),
        (0.99, 0.591955609933068),
        (1, 0.599585332847866),
    ],
}
REGION_TOLERANCE = 1e-3

# minimal worst-case number of binary questions, (worst, best-case leaf)
COMPLEXITY = {
    "standard": (0, 0),
    "abba": (1, 1),
    "catchup": (2, 2),
    "adj-catchup": (3, 2),
    "composite(4,abba,catchup)": (3, 2),
}

# worked example: the same team outcomes (Red = A) under each rule, as kick
# strings in kick order, with the first kicker of every round
TABLE1 = {
    "standard": ("SS.MM.SS.SM.MS.SS.SM", "AAAAAAA"),
    "abba": ("SS.MM.SS.MS.MS.SS.SM", "ABABABA"),
    "catchup": ("SS.MM.SS.MS.SM.SS.MS", "ABABBAB"),
    "adj-catchup": ("SS.MM.SS.MS.SM.SS.SM", "ABABBBA"),
}
TABLE1_RED = "SMSSMSS"
TABLE1_BLUE = "SMSMSSM"
