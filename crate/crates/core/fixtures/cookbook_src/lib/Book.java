package lib;

public class Book {
    private Author author;

    public Author getAuthor() {
        return author;
    }
}
