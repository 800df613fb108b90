package fixtures.speculative.smelly;

public abstract class ExportFormat {
    public abstract String render(String content);
}

class PlainTextFormat extends ExportFormat {
    @Override
    public String render(String content) {
        return content.trim();
    }

    public int lineCount(String content) {
        return content.split("\n").length;
    }

    public void beforeRender() {
    }
}
