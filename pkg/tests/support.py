"""Deterministic scripted backends and the golden fixture corpus.

The scripted LLM is a pure function of the request, so recording a run and
replaying it later is byte-stable. Fixture articles are styled on real
verification cases: confirmed breaking news, a fabricated transfer rumor,
a conflicted celebrity rumor, a sensational health hoax, and two stories
where strong sourcing supports the claim.
"""

import re
from datetime import date

from newsver.errors import MalformedResponse
from newsver.models import CredibilityRating
from newsver.providers.base import LlmRequest, RawImageHit, RawSearchHit
from newsver.providers.credibility import CredibilityTable

D = date.fromisoformat


def hit(url, title, snippet, rank, published=None):
    return RawSearchHit(
        url=url,
        title=title,
        snippet=snippet,
        rank=rank,
        published_date=D(published) if published else None,
    )


def image_hit(image_url, article_url, entities, title, summary, published=None):
    return RawImageHit(
        image_url=image_url,
        article_url=article_url,
        web_entities=tuple(entities),
        article_title=title,
        article_summary=summary,
        published_date=D(published) if published else None,
    )


CREDIBILITY_RATINGS = {
    "reuters.com": CredibilityRating.HIGH,
    "bbc.co.uk": CredibilityRating.HIGH,
    "espn.com": CredibilityRating.HIGH,
    "npr.org": CredibilityRating.HIGH,
    "pbs.org": CredibilityRating.HIGH,
    "cbc.ca": CredibilityRating.HIGH,
    "snopes.com": CredibilityRating.HIGH,
    "politifact.com": CredibilityRating.HIGH,
    "apnews.com": CredibilityRating.HIGH,
    "aerotime.aero": CredibilityRating.MEDIUM,
    "wikipedia.org": CredibilityRating.MEDIUM,
    "usmagazine.com": CredibilityRating.MEDIUM,
    "eonline.com": CredibilityRating.MEDIUM,
    "vox.com": CredibilityRating.MEDIUM,
    "indiatoday.in": CredibilityRating.MEDIUM,
    "ndtv.com": CredibilityRating.MEDIUM,
    "flightglobal.example": CredibilityRating.MEDIUM,
    "dailybuzz.example": CredibilityRating.LOW,
    "gossipdaily.example": CredibilityRating.LOW,
    "conspiracywire.example": CredibilityRating.LOW,
    "miracleinsider.example": CredibilityRating.LOW,
}


def credibility_table() -> CredibilityTable:
    return CredibilityTable(CREDIBILITY_RATINGS)


def make_news(slug: str):
    from newsver.models import Label, NewsItem

    raw = FIXTURES[slug]["article"]
    return NewsItem(
        id=raw["id"],
        headline=raw["headline"],
        body=raw["body"],
        image=raw.get("image"),
        gold_label=Label(raw["gold_label"]) if raw.get("gold_label") else None,
    )


def credibility_tsv() -> str:
    lines = [f"{domain}\t{rating.value}" for domain, rating in sorted(CREDIBILITY_RATINGS.items())]
    return "\n".join(lines) + "\n"


FIXTURES = {
    "air-india": {
        "article": {
            "id": "air-india",
            "headline": "Air India Flight 171 crashes shortly after takeoff in Ahmedabad",
            "body": (
                "Air India Flight 171 was a scheduled passenger flight from Ahmedabad to London "
                "Gatwick that crashed 32 seconds after takeoff on 12 June 2025. All 12 crew "
                "members and 229 of the 230 passengers aboard died. A preliminary report found "
                "the fuel control switches had moved to the cutoff position seconds before the "
                "loss of thrust."
            ),
            "image": "img-air-india",
            "gold_label": "REAL",
        },
        "claim": {
            "claim": (
                "Air India Flight 171 crashed on 12 June 2025 shortly after takeoff from "
                "Ahmedabad, killing 241 people aboard."
            ),
            "entities": ["Air India Flight 171", "Ahmedabad", "12 June 2025"],
        },
        "search_hits": [
            hit("https://www.reuters.com/world/india/ai171-crash", "Air India Flight 171 crash confirmed with 241 dead",
                "Air India Flight 171 crashed on 12 June 2025 shortly after takeoff from Ahmedabad, killing 241 people aboard, officials confirmed.",
                1, "2025-06-13"),
            hit("https://www.bbc.co.uk/news/ai171", "Air India Flight 171 crashes after takeoff in Ahmedabad",
                "The London-bound Boeing 787 came down 32 seconds after takeoff from Ahmedabad on 12 June 2025.",
                2, "2025-06-12"),
            hit("https://www.reuters.com/world/india/ai171-followup", "Air India crash investigation continues",
                "Investigators are examining the wreckage of Flight 171 in Ahmedabad.",
                3, "2025-06-18"),
            hit("https://www.aerotime.aero/articles/fuel-switches-ai171", "Fuel switches cut off before Air India 787 crash, report says",
                "A preliminary report says the fuel control switches on Air India Flight 171 moved to cutoff shortly after takeoff.",
                4, "2025-07-12"),
            hit("https://en.wikipedia.org/wiki/Air_India_Flight_171", "Air India Flight 171 - Wikipedia",
                "Air India Flight 171 crashed on 12 June 2025 after takeoff from Ahmedabad; 241 of the 242 people aboard were killed.",
                5, "2025-06-14"),
            hit("https://www.apnews.com/article/ai171", "India mourns victims of Air India Flight 171 crash",
                "Families gathered in Ahmedabad after the 12 June 2025 crash of Air India Flight 171 that killed 241 people aboard.",
                6, "2025-06-13"),
            hit("https://www.indiatoday.in/ai171-memorial", "Memorial held for Air India Flight 171 victims",
                "A memorial service honored those killed when Flight 171 crashed after takeoff from Ahmedabad.",
                7, "2025-06-20"),
            hit("https://www.ndtv.com/ai171-aaib", "AAIB releases preliminary report on Ahmedabad crash",
                "The Aircraft Accident Investigation Bureau released its preliminary findings on the Air India Flight 171 crash.",
                8, "2025-07-11"),
            hit("https://www.flightglobal.example/ai171-analysis", "Analysis: what brought down Air India Flight 171",
                "Aviation analysts weigh the evidence from the Ahmedabad crash of 12 June 2025.",
                9, "2025-06-25"),
            hit("https://www.dailybuzz.example/ai171-theories", "Air India crash conspiracy theories swirl online",
                "Unverified social posts speculate wildly about the Ahmedabad crash.",
                10, "2025-06-21"),
            hit("https://www.conspiracywire.example/ai171-hoax", "Was the Air India crash staged?",
                "A fringe blog suggests without evidence that the crash footage was fabricated.",
                11, None),
            hit("https://www.pbs.org/ai171-report", "PBS: Air India Flight 171 preliminary report explained",
                "What the preliminary report says about the crash of Air India Flight 171 near Ahmedabad on 12 June 2025.",
                12, "2025-07-12"),
            hit("https://www.npr.org/ai171-victims", "Remembering the victims of Air India Flight 171",
                "Profiles of those killed in the 12 June 2025 crash shortly after takeoff from Ahmedabad.",
                13, "2025-06-15"),
            hit("https://www.cbc.ca/ai171-survivor", "Sole survivor of Air India Flight 171 speaks",
                "The only passenger to survive the Ahmedabad crash describes the seconds after takeoff.",
                14, "2025-06-17"),
            hit("https://www.politifact.com/ai171-factcheck", "Fact-check: viral claims about the Air India crash",
                "Sorting confirmed facts from rumor after Air India Flight 171 crashed on 12 June 2025.",
                15, "2025-06-19"),
            hit("https://www.snopes.com/ai171-photo", "Does this photo show the Air India Flight 171 crash site?",
                "A widely shared image of the Ahmedabad crash site is authentic.",
                16, "2025-06-16"),
            hit("https://www.vox.com/ai171-safety", "What the Air India crash means for aviation safety",
                "The 12 June 2025 crash of Flight 171 raises questions about fuel-switch design.",
                17, "2025-07-01"),
        ],
        "image_entities": ["aircraft", "smoke", "runway"],
        "image_summary": (
            "The image shows a commercial aircraft engulfed in dark smoke beside a runway, "
            "consistent with photographs of the Air India Flight 171 crash site in Ahmedabad."
        ),
        "image_hits": [
            image_hit("https://img.example/ai171-1.jpg", "https://www.reuters.com/world/india/ai171-crash-photos",
                      ["aircraft", "crash"], "Photos: Air India Flight 171 crash site in Ahmedabad",
                      "Images from the Ahmedabad crash site of Air India Flight 171 after takeoff on 12 June 2025.",
                      "2025-06-13"),
            image_hit("https://img.example/ai171-2.jpg", "https://www.bbc.co.uk/news/ai171-images",
                      ["aircraft", "smoke"], "Air India Flight 171 wreckage pictured in Ahmedabad",
                      "Wreckage of Air India Flight 171 photographed shortly after the 12 June 2025 crash killing 241 people aboard.",
                      "2025-06-12"),
            image_hit("https://img.example/ai171-3.jpg", "", ["aircraft"],
                      "Orphaned image result", "A matching image with no article attached.", None),
            image_hit("https://img.example/gala.jpg", "https://www.gossipdaily.example/gala-photos",
                      ["red carpet"], "Celebrity gala red carpet highlights",
                      "Stars arrive at the annual charity gala in designer outfits.", "2024-11-02"),
            image_hit("https://img.example/ai171-4.jpg", "https://www.ndtv.com/ai171-ground",
                      ["smoke", "building"], "Ground damage from Air India Flight 171 crash",
                      "Buildings near Ahmedabad airport damaged when Air India Flight 171 crashed after takeoff.",
                      "2025-06-14"),
            image_hit("https://img.example/ai171-5.jpg", "https://www.apnews.com/ai171-gallery",
                      ["aircraft", "runway"], "Gallery: Air India Flight 171 aftermath in Ahmedabad",
                      "Scenes from Ahmedabad after the crash of Air India Flight 171 on 12 June 2025.",
                      "2025-06-15"),
        ],
        "kg": [
            {"subject": "Air India Flight 171", "relation": "operatedBy", "object": "Air India", "source": "wikidata"},
            {"subject": "Air India", "relation": "headquarteredIn", "object": "Gurugram", "source": "wikidata"},
            {"subject": "Ahmedabad", "relation": "locatedIn", "object": "Gujarat, India", "source": "dbpedia"},
        ],
        "stances": [
            ("Air India Flight 171 crash confirmed", "SUPPORTING"),
            ("crashes after takeoff in Ahmedabad", "SUPPORTING"),
            ("Fuel switches cut off", "SUPPORTING"),
            ("Air India Flight 171 - Wikipedia", "SUPPORTING"),
            ("India mourns victims", "SUPPORTING"),
            ("preliminary report explained", "SUPPORTING"),
            ("Remembering the victims", "SUPPORTING"),
            ("Sole survivor", "SUPPORTING"),
            ("viral claims about the Air India crash", "NEUTRAL"),
            ("conspiracy theories swirl", "NEUTRAL"),
            ("Was the Air India crash staged", "CONTRADICTING"),
            ("crash site in Ahmedabad", "SUPPORTING"),
            ("wreckage pictured", "SUPPORTING"),
            ("Ground damage", "SUPPORTING"),
            ("aftermath in Ahmedabad", "SUPPORTING"),
        ],
        "verdicts": {
            1: {"verdict": "REAL", "confidence": 0.95,
                "justification": "The crash of Air India Flight 171 on 12 June 2025 is corroborated by high-reliability coverage [T1] and the preliminary investigation report [T2]; casualty figures match across sources and the only dissent comes from a fringe blog.",
                "citations": ["T1", "T2"]},
        },
    },
    "ronaldo": {
        "article": {
            "id": "ronaldo",
            "headline": "Cristiano Ronaldo joining Lionel Messi at Inter Miami for the Club World Cup",
            "body": (
                "In a surprising turn of events, football legends Cristiano Ronaldo and Lionel "
                "Messi are reportedly set to team up at Inter Miami for the upcoming Club World "
                "Cup. Sources close to the club have hinted at a groundbreaking partnership "
                "between the two superstars."
            ),
            "image": None,
            "gold_label": "FAKE",
        },
        "claim": {
            "claim": "Cristiano Ronaldo is joining Inter Miami to play alongside Lionel Messi at the Club World Cup.",
            "entities": ["Cristiano Ronaldo", "Inter Miami", "Lionel Messi", "Club World Cup"],
        },
        "search_hits": [
            hit("https://www.espn.com/soccer/ronaldo-al-nassr", "Ronaldo is not joining Inter Miami or Lionel Messi, sources say",
                "Cristiano Ronaldo is not joining Inter Miami to play alongside Lionel Messi at the Club World Cup; he remains under contract with Al Nassr.",
                1, "2025-05-20"),
            hit("https://www.npr.org/messi-inter-miami", "Messi confirmed at Inter Miami as Ronaldo rumor spreads unfounded",
                "Lionel Messi plays for Inter Miami; reports that Cristiano Ronaldo is joining him for the Club World Cup lack any official confirmation.",
                2, "2025-05-21"),
            hit("https://www.gossipdaily.example/ronaldo-messi", "Ronaldo and Messi to unite at Inter Miami!",
                "Insiders say Cristiano Ronaldo is joining Lionel Messi at Inter Miami for the Club World Cup.",
                3, "2025-05-19"),
            hit("https://www.dailybuzz.example/ronaldo-shock", "Shock transfer: Ronaldo to Miami?",
                "A viral post claims the superstar is on his way to Inter Miami.",
                4, None),
            hit("https://en.wikipedia.org/wiki/Cristiano_Ronaldo", "Cristiano Ronaldo - Wikipedia",
                "Cristiano Ronaldo is a Portuguese footballer who plays for Al Nassr.",
                5, "2025-05-01"),
        ],
        "image_entities": [],
        "image_hits": [],
        "kg": [
            {"subject": "Cristiano Ronaldo", "relation": "memberOf", "object": "Al Nassr", "source": "wikidata"},
            {"subject": "Lionel Messi", "relation": "memberOf", "object": "Inter Miami", "source": "wikidata"},
        ],
        "stances": [
            ("not joining Inter Miami", "CONTRADICTING"),
            ("rumor spreads unfounded", "CONTRADICTING"),
            ("Ronaldo and Messi to unite", "SUPPORTING"),
            ("Shock transfer", "SUPPORTING"),
            ("Cristiano Ronaldo - Wikipedia", "NEUTRAL"),
        ],
        "verdicts": {
            1: {"verdict": "FAKE", "confidence": 0.95,
                "justification": "High-reliability reporting [T1] states Ronaldo remains under contract with Al Nassr and [T2] confirms only Messi's presence at Inter Miami; the transfer claim is carried solely by low-reliability aggregators.",
                "citations": ["T1", "T2"]},
        },
    },
    "affleck": {
        "article": {
            "id": "affleck",
            "headline": "Ben Affleck and Lindsay Shookus planning a wedding even though he is still married?",
            "body": (
                "It has been almost a year since the world first learned that Ben Affleck and "
                "Lindsay Shookus are dating, and the couple is reportedly ready to take the next "
                "step. Unfortunately, there are some sizable barriers blocking their path to the "
                "altar."
            ),
            "image": None,
            "gold_label": "FAKE",
        },
        "claim": {
            "claim": "Ben Affleck and Lindsay Shookus are planning a wedding while his divorce is not final.",
            "entities": ["Ben Affleck", "Lindsay Shookus"],
        },
        "search_hits": [
            hit("https://www.usmagazine.com/affleck-shookus-timeline", "Ben Affleck and Lindsay Shookus relationship said to be serious",
                "Ben Affleck and Lindsay Shookus are planning a wedding while his divorce is not final, sources tell the magazine.",
                1, "2018-06-10"),
            hit("https://www.eonline.com/affleck-shookus-split", "Ben Affleck and Lindsay Shookus not planning any wedding, insiders say",
                "Insiders say Ben Affleck and Lindsay Shookus are not planning a wedding while his divorce is not final.",
                2, "2018-06-12"),
            hit("https://www.gossipdaily.example/affleck-rumor", "Affleck wedding rumors heat up",
                "Tabloid chatter about a possible Affleck wedding continues.",
                3, "2018-06-01"),
        ],
        "image_entities": [],
        "image_hits": [],
        "kg": [
            {"subject": "Ben Affleck", "relation": "spouseOf", "object": "Jennifer Garner", "source": "wikidata"},
        ],
        "stances": [
            ("relationship said to be serious", "SUPPORTING"),
            ("not planning any wedding", "CONTRADICTING"),
            ("wedding rumors heat up", "NEUTRAL"),
        ],
        "verdicts": {
            1: {"verdict": "UNCERTAIN", "confidence": 0.7,
                "justification": "Medium-reliability sources conflict: [T1] reports wedding planning while [T2] denies it, and no high-reliability outlet or official statement settles the question.",
                "citations": ["T1", "T2"]},
            2: {"verdict": "UNCERTAIN", "confidence": 0.6,
                "justification": "Even weighing the persuasion analysis, the evidence remains split between [T1] and [T2] with no high-reliability confirmation either way, so the claim cannot be settled.",
                "citations": ["T1", "T2"]},
        },
        "persuasion": {
            "techniques": [
                {"technique": "Appeal to Popularity", "span": "the world first learned"},
                {"technique": "Exaggeration/Minimisation", "span": "sizable barriers blocking their path"},
            ],
            "summary": "The piece leans on Appeal to Popularity by framing the romance as universally watched and on Exaggeration/Minimisation in its dramatic obstacle language.",
        },
    },
    "miracle": {
        "article": {
            "id": "miracle",
            "headline": "SHOCKING!!! Doctors hate this miracle cure for aging",
            "body": (
                "A viral post claims a miracle cure reverses aging overnight and that doctors "
                "hate it. No peer-reviewed study supports the claim."
            ),
            "image": None,
            "gold_label": "FAKE",
        },
        "claim": {
            "claim": "A miracle cure that reverses aging overnight is being suppressed by doctors.",
            "entities": [],
        },
        "search_hits": [
            hit("https://www.healthblog.example/miracle-cure", "Wellness blog repeats miracle cure story",
                "A wellness blog repeats the viral claim about a cure for aging.",
                1, None),
        ],
        "image_entities": [],
        "image_hits": [],
        "kg": [],
        "stances": [
            ("Wellness blog repeats", "NEUTRAL"),
        ],
        "verdicts": {
            1: {"verdict": "UNCERTAIN", "confidence": 0.5,
                "justification": "The memory contains almost no independent evidence about the claim; the single retrieved item merely repeats it without verification.",
                "citations": []},
            2: {"verdict": "FAKE", "confidence": 0.85,
                "justification": "The persuasion analysis found loaded and exaggerated wording typical of health hoaxes, the headline triggers deterministic sensationalism checks, and no credible source supports the claim.",
                "citations": []},
        },
        "persuasion": {
            "techniques": [
                {"technique": "Loaded Language", "span": "miracle cure"},
                {"technique": "Exaggeration/Minimisation", "span": "reverses aging overnight"},
            ],
            "summary": "The content uses Loaded Language around its supposed cure and Exaggeration/Minimisation in promising overnight reversal of aging.",
        },
    },
    "strzok": {
        "article": {
            "id": "strzok",
            "headline": "Peter Strzok, FBI agent in texting scandal, will testify before Congress",
            "body": (
                "Peter Strzok, the FBI agent who sent anti-Trump messages to a colleague while "
                "leading the investigation of Hillary Clinton's emails, has said he is willing "
                "to testify before the House Judiciary Committee or any other committee."
            ),
            "image": None,
            "gold_label": "FAKE",
        },
        "claim": {
            "claim": "FBI agent Peter Strzok will testify before Congress about his role in the email and Russia investigations.",
            "entities": ["Peter Strzok", "FBI", "Congress"],
        },
        "search_hits": [
            hit("https://www.pbs.org/strzok-testimony", "FBI agent Peter Strzok will testify before Congress",
                "FBI agent Peter Strzok will testify before Congress about his role in the email and Russia investigations, the committee said.",
                1, "2018-07-10"),
            hit("https://www.cbc.ca/strzok-hearing", "Strzok agrees to testify at congressional hearing",
                "Peter Strzok has agreed to appear before the House Judiciary Committee.",
                2, "2018-07-11"),
            hit("https://www.vox.com/strzok-explainer", "The Strzok hearing, explained",
                "What to expect when FBI agent Peter Strzok testifies before Congress.",
                3, "2018-07-12"),
            hit("https://www.dailybuzz.example/strzok-drama", "Strzok drama engulfs Washington",
                "Commentators trade barbs over the upcoming testimony.",
                4, None),
        ],
        "image_entities": [],
        "image_hits": [],
        "kg": [
            {"subject": "Peter Strzok", "relation": "memberOf", "object": "FBI", "source": "wikidata"},
        ],
        "stances": [
            ("will testify before Congress", "SUPPORTING"),
            ("agrees to testify", "SUPPORTING"),
            ("hearing, explained", "SUPPORTING"),
            ("drama engulfs", "NEUTRAL"),
        ],
        "verdicts": {
            1: {"verdict": "REAL", "confidence": 0.90,
                "justification": "High-reliability coverage [T1] and [T3] confirm Strzok's agreement to testify before the House Judiciary Committee, consistent with the committee's own statements.",
                "citations": ["T1", "T3"]},
        },
    },
    "walkout": {
        "article": {
            "id": "walkout",
            "headline": "Ohio student suspended for staying in class during National Walkout Day",
            "body": (
                "An Ohio high school student said he tried to stay apolitical during the "
                "National Walkout Day over gun violence but was suspended for his choice to "
                "remain in a classroom instead of joining protests or going to study hall."
            ),
            "image": "img-walkout",
            "gold_label": "FAKE",
        },
        "claim": {
            "claim": "An Ohio student was suspended for staying in class during National Walkout Day.",
            "entities": ["Ohio", "National Walkout Day"],
        },
        "search_hits": [
            hit("https://www.snopes.com/student-suspended", "Ohio student suspended for staying in class during walkout, confirmed",
                "An Ohio student was suspended for staying in class during National Walkout Day, school records confirm.",
                1, "2018-03-26"),
            hit("https://www.politifact.com/ohio-walkout", "Was an Ohio student suspended for staying in class during National Walkout Day?",
                "The suspension happened, though school policy cites supervision rules rather than politics.",
                2, "2018-03-28"),
            hit("https://www.dailybuzz.example/walkout-outrage", "Outrage over walkout suspension",
                "Social media erupts over the Ohio suspension story.",
                3, None),
        ],
        "image_entities": [],
        "image_summary": (
            "The image shows the exterior of a suburban American high school with a flag pole "
            "and an empty courtyard on an overcast day."
        ),
        "image_hits": [
            image_hit("https://img.example/school-1.jpg", "https://www.snopes.com/student-suspended",
                      ["school", "building"], "Ohio school at center of walkout suspension story",
                      "The Ohio high school where a student was suspended for staying in class during National Walkout Day.",
                      "2018-03-27"),
            image_hit("https://img.example/school-2.jpg", "https://www.dailybuzz.example/walkout-outrage",
                      ["school"], "School building stock photo",
                      "Stock photo of an American school building.", None),
            image_hit("https://img.example/unrelated.jpg", "https://www.gossipdaily.example/prom-photos",
                      ["dance"], "Prom season highlights",
                      "Students celebrate prom season across the country.", "2018-05-02"),
        ],
        "kg": [
            {"subject": "National Walkout Day", "relation": "dateOf", "object": "March 14, 2018", "source": "googlekg"},
        ],
        "stances": [
            ("suspended for staying in class during walkout, confirmed", "SUPPORTING"),
            ("Was an Ohio student suspended", "SUPPORTING"),
            ("Outrage over walkout suspension", "NEUTRAL"),
            ("center of walkout suspension story", "SUPPORTING"),
            ("School building stock photo", "NEUTRAL"),
        ],
        "verdicts": {
            1: {"verdict": "REAL", "confidence": 0.95,
                "justification": "High-reliability fact-checks [T1] and [T2] confirm the suspension occurred; the reports attribute it to supervision policy, but the core claim that the student was suspended is verified.",
                "citations": ["T1", "T2"]},
        },
    },
    "ghost": {
        "article": {
            "id": "ghost",
            "headline": "Community library reopens after flood repairs in Riverton",
            "body": (
                "The Riverton community library reopened this week after months of repairs "
                "following the spring flood. Local officials credited volunteers for restoring "
                "the children's reading room."
            ),
            "image": "img-ghost",
            "gold_label": "REAL",
        },
        "claim": {
            "claim": "The Riverton community library reopened after flood repairs.",
            "entities": ["Riverton"],
        },
        "search_hits": [
            hit("https://www.localnews.example/riverton-library", "Riverton library reopening celebrated",
                "The community library in Riverton reopened after flood repairs this week.",
                1, "2025-04-02"),
        ],
        "image_entities": [],
        "image_hits": [],
        "kg": [
            {"subject": "Riverton", "relation": "locatedIn", "object": "United States", "source": "llm-internal"},
        ],
        "stances": [
            ("library reopening celebrated", "NEUTRAL"),
        ],
        "verdicts": {
            1: {"verdict": "REAL", "confidence": 0.70,
                "justification": "Local coverage [T1] reports the reopening; although sourcing is thin, nothing contradicts the claim and the event is mundane and plausible.",
                "citations": ["T1"]},
        },
    },
}

GOLDEN_IDS = ("air-india", "ronaldo", "affleck", "miracle", "strzok", "walkout")

EXPECTED_VERDICTS = {
    "air-india": ("REAL", False),
    "ronaldo": ("FAKE", False),
    "affleck": ("UNCERTAIN", True),
    "miracle": ("FAKE", True),
    "strzok": ("REAL", False),
    "walkout": ("REAL", False),
    "ghost": ("REAL", False),
}

_ROLE_WORDS = {
    "You are the SUPERVISOR": "supervisor",
    "You are the JOURNALIST": "journalist",
    "You are the LEGAL ANALYST": "legal",
    "You are the SCIENTIFIC EXPERT": "scientific",
}

_ASKED_RE = re.compile(r"Questions already asked \((\d+) total\)")
_QA_LINE_RE = re.compile(r"\] Q: ")
_INSIGHT_ANSWER_RE = re.compile(r"Answer: (.*)\n\nInsight:", re.DOTALL)
_STANCE_TITLE_RE = re.compile(r"Evidence title: (.*)")
_ANSWER_SLUG_RE = re.compile(r"\[answer (\d+) on ([a-z-]+)\]")


def _slug_from(text: str) -> str | None:
    for slug, fixture in FIXTURES.items():
        if fixture["article"]["headline"] in text:
            return slug
        if fixture["claim"]["claim"] in text:
            return slug
        if fixture["search_hits"] and fixture["search_hits"][0].title in text:
            return slug
        persuasion = fixture.get("persuasion")
        if persuasion and persuasion["summary"] and persuasion["summary"] in text:
            return slug
    return None


class ScriptedLlm:
    """Rule-driven fake completion backend: a pure function of the request."""

    def complete(self, request: LlmRequest) -> str:
        prompt = request.prompt
        if prompt.startswith("Distill the news article"):
            return self._claim(prompt)
        if prompt.startswith("Write one coherent paragraph"):
            return self._image_summary(prompt)
        if "factual knowledge-graph triplets" in prompt:
            return self._kg(prompt)
        if prompt.startswith("Analyze the news content below for persuasion techniques"):
            return self._persuasion(prompt)
        if prompt.startswith("Classify the stance of the evidence item"):
            return self._stance(prompt)
        if prompt.startswith("You are the final verdict classifier"):
            return self._classify(prompt)
        if prompt.startswith("Condense the question/answer exchange"):
            return self._insight(prompt)
        if "You are the ANSWERING AGENT" in prompt:
            return self._answer(prompt)
        for marker, word in _ROLE_WORDS.items():
            if marker in prompt:
                return self._question(prompt, word)
        raise MalformedResponse(f"scripted backend has no rule for prompt: {prompt[:80]!r}")

    def _claim(self, prompt: str) -> str:
        slug = _slug_from(prompt)
        fixture = FIXTURES[slug]["claim"]
        import json

        return json.dumps({"claim": fixture["claim"], "entities": fixture["entities"]})

    def _image_summary(self, prompt: str) -> str:
        for slug, fixture in FIXTURES.items():
            image = fixture["article"].get("image")
            if image and f"Image reference: {image}" in prompt:
                return fixture["image_summary"]
        raise MalformedResponse("unknown image in summary prompt")

    def _kg(self, prompt: str) -> str:
        import json

        slug = _slug_from(prompt)
        return json.dumps(FIXTURES[slug]["kg"])

    def _persuasion(self, prompt: str) -> str:
        import json

        slug = _slug_from(prompt)
        report = FIXTURES[slug].get("persuasion")
        if report is None:
            return json.dumps({"techniques": [], "summary": ""})
        return json.dumps(report)

    def _stance(self, prompt: str) -> str:
        match = _STANCE_TITLE_RE.search(prompt)
        title = match.group(1) if match else ""
        for fixture in FIXTURES.values():
            for needle, stance in fixture["stances"]:
                if needle in title:
                    return stance
        return "NEUTRAL"

    def _insight(self, prompt: str) -> str:
        match = _INSIGHT_ANSWER_RE.search(prompt)
        answer = match.group(1).strip() if match else ""
        head = " ".join(answer.split()[:8])
        return f"Noted: {head}."

    def _classify(self, prompt: str) -> str:
        import json

        match = _ANSWER_SLUG_RE.search(prompt)
        slug = match.group(2) if match else _slug_from(prompt)
        passes = FIXTURES[slug]["verdicts"]
        which = 2 if "Persuasion analysis:" in prompt and 2 in passes else 1
        return json.dumps(passes[which])

    def _question(self, prompt: str, persona_word: str) -> str:
        slug = _slug_from(prompt) or "unknown"
        asked = int(_ASKED_RE.search(prompt).group(1))
        return f"As the {persona_word}, question {asked + 1} on {slug}: is point {asked + 1} corroborated?"

    def _answer(self, prompt: str) -> str:
        slug = _slug_from(prompt) or "unknown"
        count = len(_QA_LINE_RE.findall(prompt)) + 1
        if "no external evidence retrieved" in prompt:
            return f"[answer {count} on {slug}] There is insufficient evidence to answer this question."
        return (
            f"[answer {count} on {slug}] The retrieved evidence remains consistent with the claim [T1]."
        )


class KeyedSearchBackend:
    """Maps each fixture's claim text to its scripted hit list."""

    def search(self, query: str, max_results: int) -> list[RawSearchHit]:
        for fixture in FIXTURES.values():
            if fixture["claim"]["claim"] == query:
                return list(fixture["search_hits"])[:max_results]
        return []


class FixtureVisionBackend:
    """Reverse search and entity extraction for the fixture images."""

    def reverse_search(self, image: str) -> list[RawImageHit]:
        from newsver.errors import UnresolvableImage

        for fixture in FIXTURES.values():
            if fixture["article"].get("image") == image and fixture["image_hits"]:
                return list(fixture["image_hits"])
        raise UnresolvableImage(f"unknown image reference: {image}")

    def entities(self, image: str) -> list[str]:
        from newsver.errors import UnresolvableImage

        for fixture in FIXTURES.values():
            if fixture["article"].get("image") == image:
                if image == "img-ghost":
                    raise UnresolvableImage("ghost image cannot be resolved")
                return list(fixture["image_entities"])
        raise UnresolvableImage(f"unknown image reference: {image}")


def scripted_backends() -> dict:
    from newsver.providers.mock import TokenOverlapSimilarity

    return {
        "llm": ScriptedLlm(),
        "search": KeyedSearchBackend(),
        "vision": FixtureVisionBackend(),
        "similarity": TokenOverlapSimilarity(),
        "credibility": credibility_table(),
    }
